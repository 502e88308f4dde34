use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let args: Vec<String> = std::env::args().collect();
    let result = ht_cli::run(&args);
    if !result.stderr.is_empty() {
        eprint!("{}", result.stderr);
    }
    if !result.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(result.stdout.as_bytes());
        let _ = out.flush();
    }
    ExitCode::from(result.code)
}
