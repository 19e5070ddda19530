fn main() {
    std::process::exit(exo_coherent::cli::run(std::env::args_os()));
}
