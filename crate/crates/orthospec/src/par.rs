//! Shared worker pool. `ORTHOSPEC_THREADS` caps its size.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let n = std::env::var("ORTHOSPEC_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0);
        let mut b = ThreadPoolBuilder::new();
        if let Some(n) = n {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}
