fn main() {
    std::process::exit(lemni::cli::main_with_args(std::env::args_os()));
}
