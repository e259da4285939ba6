fn main() {
    let code = regulus::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
