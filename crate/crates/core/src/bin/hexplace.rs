fn main() {
    hexplace::cli::init_logging();
    std::process::exit(hexplace::cli::main_with_args(std::env::args_os()));
}
