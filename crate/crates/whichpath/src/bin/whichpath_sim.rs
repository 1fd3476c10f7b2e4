fn main() {
    std::process::exit(whichpath_sim::cli::run(std::env::args_os()));
}
