fn main() {
    std::process::exit(summa::cli::run(std::env::args_os()));
}
