fn main() {
    std::process::exit(mixedarea::cli::run(std::env::args_os()));
}
