fn main() {
    std::process::exit(bfic::cli::run_from(std::env::args_os()));
}
