fn main() {
    std::process::exit(petrocheck::cli::run(std::env::args_os()));
}
