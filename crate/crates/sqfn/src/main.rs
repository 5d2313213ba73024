fn main() {
    std::process::exit(sqfn::cli::dispatch(std::env::args_os()));
}
