use clap::Parser;

fn main() {
    conelab::cli::init_thread_pool();
    let cli = conelab::cli::Cli::parse();
    std::process::exit(conelab::cli::run(cli).code());
}
