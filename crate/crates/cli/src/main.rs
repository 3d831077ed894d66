fn main() {
    std::process::exit(toral_mass::run(std::env::args_os()));
}
