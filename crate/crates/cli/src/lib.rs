//! Suite runner, instance loader and diagonal probe behind the `altkit`
//! command-line tool. Every entry point returns a [`report::Report`] whose
//! serialization depends only on its inputs.

pub mod config;
pub mod error;
pub mod instance;
pub mod probe;
pub mod report;
pub mod suite;

pub use error::CliError;

/// Runs `f` on a pool capped by `ALTKIT_THREADS` when it is set to a
/// positive integer, and on the global pool otherwise.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var("ALTKIT_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}
