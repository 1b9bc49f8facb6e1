fn main() {
    std::process::exit(homspasm::cli::main_from_env());
}
