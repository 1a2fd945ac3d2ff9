fn main() {
    std::process::exit(qfalab::cli::main_with_args(std::env::args_os()));
}
