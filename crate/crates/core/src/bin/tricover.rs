fn main() {
    std::process::exit(tricover::cli::dispatch(std::env::args()));
}
