fn main() {
    std::process::exit(holeprob::cli::main_entry());
}
