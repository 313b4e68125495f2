fn main() {
    std::process::exit(diracwalk::cli::run(std::env::args_os()));
}
