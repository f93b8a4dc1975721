fn main() {
    std::process::exit(finetti::cli::run(std::env::args_os()));
}
