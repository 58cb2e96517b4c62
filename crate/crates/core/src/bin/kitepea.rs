fn main() {
    std::process::exit(kitepea::cli::run(std::env::args_os()));
}
