fn main() {
    std::process::exit(salbase::cli::main_from_args(std::env::args_os()));
}
