fn main() {
    std::process::exit(chartline::cli::run(std::env::args_os()));
}
