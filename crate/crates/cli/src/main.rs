fn main() {
    std::process::exit(polytrope_sound_cli::run_cli(std::env::args_os()));
}
