use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SLIPSTAB_LOG", "warn")).init();
    let cli = slipstab_cli::Cli::parse();
    std::process::exit(slipstab_cli::run(cli));
}
