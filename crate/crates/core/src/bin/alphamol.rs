fn main() {
    std::process::exit(alpha_molecules::cli::main_with_args(std::env::args_os()));
}
