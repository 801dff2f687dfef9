fn main() {
    std::process::exit(kirchhoff::cli::main_entry());
}
