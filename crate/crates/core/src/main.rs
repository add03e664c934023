fn main() {
    std::process::exit(qorbit::cli::run(std::env::args_os()));
}
