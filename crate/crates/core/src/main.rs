fn main() {
    std::process::exit(kpip::cli::run(std::env::args_os()));
}
