fn main() {
    std::process::exit(competing_sir::cli::main_entry(std::env::args_os()));
}
