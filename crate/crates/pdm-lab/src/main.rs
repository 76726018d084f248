fn main() { std::process::exit(pdm_lab::cli::run()); }
