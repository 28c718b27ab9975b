fn main() {
    let depth = std::env::var(metrilog::cli::DEPTH_ENV).ok();
    let code = metrilog::cli::run(std::env::args_os(), depth, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
