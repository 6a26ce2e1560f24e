fn main() {
    std::process::exit(quasirep::cli::main_with_args(std::env::args_os()));
}
