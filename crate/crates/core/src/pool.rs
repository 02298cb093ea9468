//! Worker-count control for data-parallel sections.

/// Runs `f` on a pool with `workers` threads; `0` uses the global pool.
pub fn install<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("falling back to the global thread pool: {e}");
            f()
        }
    }
}
