fn main() {
    std::process::exit(qws::cli::main_with_args(std::env::args_os()));
}
