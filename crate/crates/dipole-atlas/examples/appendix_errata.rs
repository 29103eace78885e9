//! Reconcile the published double-torus coefficient tables against the
//! procedural assembly and print the erratum report: any row where the two
//! disagree, expressed over the tables' own vocabulary.

use dipole_atlas::genus::appendix;

fn main() {
    let rec = appendix::reconcile(6).expect("reconciliation");
    println!("{}", rec.report());
}
