fn main() {
    std::process::exit(krein_spectra::cli::main_from_env());
}
