fn main() -> std::process::ExitCode {
    hypergreedy::cli::main()
}
