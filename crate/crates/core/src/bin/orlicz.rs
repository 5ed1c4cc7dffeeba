fn main() {
    std::process::exit(orlicz_interp::cli::main_with_args(std::env::args_os()));
}
