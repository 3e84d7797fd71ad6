fn main() {
    std::process::exit(hankel_core::cli::run(std::env::args_os()));
}
