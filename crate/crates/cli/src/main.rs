fn main() {
    std::process::exit(lazytwist_cli::run(std::env::args_os()));
}
