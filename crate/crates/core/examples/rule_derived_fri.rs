//! Rule counts and FRI from the built-in splice-junction and promoter theories.
//!
//! `cargo run --example rule_derived_fri -- splice > splice.fri` writes an FRI
//! file usable with `iann --fri`.

use iann::fri::emit_fri_file;
use iann::theory::DomainTheory;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "splice".into());
    let theory = match which.as_str() {
        "promoter" => DomainTheory::promoter(),
        "splice" => DomainTheory::splice(),
        other => {
            eprintln!("unknown theory {other:?}; use promoter or splice");
            std::process::exit(2);
        }
    };
    let counts = theory.rule_counts();
    let fri = theory.fri();
    eprintln!("{} rules", theory.rules.len());
    for (i, (&c, &v)) in counts.counts.iter().zip(fri.iter()).enumerate() {
        if c > 0 {
            eprintln!(
                "position {:>4}: {c:>2} rules, fri {v}",
                theory.frame.label_of(i)
            );
        }
    }
    print!("{}", emit_fri_file(&fri));
}
