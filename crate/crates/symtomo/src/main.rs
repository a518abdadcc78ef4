fn main() { std::process::exit(symtomo::cli::run(std::env::args())); }
