use clap::{error::ErrorKind, CommandFactory, Parser};
use ct_forge::{configure_threads, run, Cli, CliError};

fn main() {
    let cli = Cli::parse();
    let sub = cli.command.name();
    let result = configure_threads().and_then(|()| run(cli));
    match result {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            let mut cmd = Cli::command().bin_name("ct-forge");
            cmd.build();
            let cmd = cmd.find_subcommand_mut(sub).expect("known subcommand");
            cmd.error(ErrorKind::ValueValidation, msg).exit();
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
