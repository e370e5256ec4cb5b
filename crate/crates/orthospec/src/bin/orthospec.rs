fn main() {
    std::process::exit(orthospec::cli::main_with_env());
}
