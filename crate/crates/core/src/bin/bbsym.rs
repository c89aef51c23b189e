use std::io;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BB_LOG", "warn")).init();
    let code = bbsym::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
