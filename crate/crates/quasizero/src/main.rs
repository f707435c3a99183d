fn main() { quasizero::cli::main(); }
