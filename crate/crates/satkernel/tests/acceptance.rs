use std::process::ExitCode;

use satkernel::acceptance;

fn main() -> ExitCode {
    println!("acceptance criteria");
    let mut failed = Vec::new();
    for id in acceptance::ids() {
        let o = acceptance::run(id).expect("known id");
        println!("{}", o.line());
        if !o.gate {
            failed.push(o.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all gates hold");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
