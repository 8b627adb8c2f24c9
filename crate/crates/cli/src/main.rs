fn main() {
    let threads = std::env::var(circfrac_cli::THREADS_ENV).ok();
    if let Some(n) = circfrac_cli::parse_threads(threads.as_deref()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = circfrac_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
