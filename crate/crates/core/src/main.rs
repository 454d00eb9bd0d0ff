fn main() {
    std::process::exit(foldprod::cli::main_with_args(std::env::args_os()));
}
