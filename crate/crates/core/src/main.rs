fn main() {
    std::process::exit(pairsim::cli::main_with(std::env::args_os()));
}
