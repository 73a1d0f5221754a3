fn main() {
    std::process::exit(prwlab::cli::main_with_args(std::env::args_os()));
}
