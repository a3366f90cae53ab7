fn main() {
    std::process::exit(sidsp::cli::main());
}
