fn main() {
    std::process::exit(lie_moduli_cli::run(std::env::args_os()));
}
