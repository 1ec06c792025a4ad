fn main() {
    eprintln!("dr: not wired up yet");
    std::process::exit(2);
}
