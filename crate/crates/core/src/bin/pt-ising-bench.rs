fn main() {
    std::process::exit(pt_ising::bench::cli_main(std::env::args_os()));
}
