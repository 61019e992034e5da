use spin_itf::cli;

fn main() {
    std::process::exit(cli::run());
}
