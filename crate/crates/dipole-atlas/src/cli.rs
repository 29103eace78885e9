//! Command-line front end. All numeric output is exact (integers or `p/q`
//! rationals); results are byte-stable for fixed inputs.
//!
//! Exit codes: 0 success, 1 usage or execution error, 2 verification
//! failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::central::Partition;
use crate::error::AtlasError;
use crate::genus;
use crate::oracle;
use crate::verify;

/// Default cap for `--order`; beyond it the factorial growth of the series
/// and the enumerator warrants an explicit override.
const ORDER_GUARD: u32 = 8;

#[derive(Parser, Debug)]
#[command(
    name = "dipole-atlas",
    version,
    about = "Exact counts of (p,q,n)-dipoles on orientable surfaces of genus 0-2",
    after_help = "The DIPOLE_ATLAS_THREADS environment variable caps enumeration parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Common {
    /// Exact series window in each tracked grade.
    #[arg(long, default_value_t = ORDER_GUARD)]
    order: u32,
    /// Permit orders and enumeration sizes beyond the built-in guards.
    #[arg(long, default_value_t = false)]
    unsafe_order: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count dipoles with prescribed invariants.
    Count {
        #[command(subcommand)]
        kind: CountKind,
    },
    /// The full (p,q,n,g) count table.
    Table {
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 2)]
        g_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
    /// Solution series, dumped as JSON term arrays.
    Series {
        #[command(subcommand)]
        kind: SeriesKind,
    },
    /// Number of rooted dipoles with face-degree sequence 2*partition,
    /// e.g. `psi 3,1`.
    Psi { partition: String },
    /// Brute-force enumeration over rotation systems.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
    /// Run every verification suite; exit 2 if any identity fails.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum CountKind {
    /// Count (p,q,n)-dipoles of genus g.
    Pqn {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        g: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Count (a,b,c,d)-dipoles of genus g.
    Abcd {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        g: u32,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesKind {
    /// Dump a named series: A, B0, B1, B2, Gamma0, Gamma1, Gamma2.
    Dump {
        #[arg(long)]
        which: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum OracleKind {
    /// Exhaustive count of a filter: pqn(p,q,n,g), abcd(a,b,c,d,g), or
    /// face_seq(lambda) such as face_seq(3,1).
    Count {
        /// Edge count; optional, must agree with the filter when given.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        filter: String,
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check the series counts against brute force up to max-n.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: u32,
        #[command(flatten)]
        common: Common,
    },
}

fn init_threads() {
    if let Ok(text) = std::env::var("DIPOLE_ATLAS_THREADS") {
        if let Ok(threads) = text.parse::<usize>() {
            // Ignore failure: the global pool can only be set once.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

fn check_order(common: &Common) -> Result<(), AtlasError> {
    if common.order > ORDER_GUARD && !common.unsafe_order {
        return Err(AtlasError::ResourceGuard(format!(
            "--order {} exceeds the guard ({ORDER_GUARD}); pass --unsafe-order to proceed",
            common.order
        )));
    }
    Ok(())
}

fn parse_partition(text: &str) -> Result<Partition, AtlasError> {
    let parts: Result<Vec<u32>, _> = text
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect();
    let parts = parts.map_err(|e| AtlasError::invalid(format!("bad partition {text:?}: {e}")))?;
    Partition::new(parts)
}

fn parse_filter(text: &str) -> Result<oracle::Filter, AtlasError> {
    let text = text.trim();
    let (name, args) = text
        .split_once('(')
        .and_then(|(n, rest)| rest.strip_suffix(')').map(|a| (n.trim(), a)))
        .ok_or_else(|| {
            AtlasError::invalid(format!(
                "bad filter {text:?}: expected name(args) such as pqn(1,1,2,0)"
            ))
        })?;
    let nums: Result<Vec<usize>, _> = args.split(',').map(|a| a.trim().parse::<usize>()).collect();
    match name {
        "pqn" => {
            let v = nums.map_err(|e| AtlasError::invalid(format!("bad filter args: {e}")))?;
            let [p, q, n, g] = v.as_slice() else {
                return Err(AtlasError::invalid("pqn filter takes (p,q,n,g)"));
            };
            Ok(oracle::Filter::Pqn {
                p: *p,
                q: *q,
                n: *n,
                g: *g,
            })
        }
        "abcd" => {
            let v = nums.map_err(|e| AtlasError::invalid(format!("bad filter args: {e}")))?;
            let [a, b, c, d, g] = v.as_slice() else {
                return Err(AtlasError::invalid("abcd filter takes (a,b,c,d,g)"));
            };
            Ok(oracle::Filter::Abcd {
                a: *a,
                b: *b,
                c: *c,
                d: *d,
                g: *g,
            })
        }
        "face_seq" => Ok(oracle::Filter::FaceSeq(parse_partition(args)?)),
        other => Err(AtlasError::invalid(format!("unknown filter kind {other:?}"))),
    }
}

fn execute(cli: Cli) -> Result<i32, AtlasError> {
    match cli.command {
        Command::Count { kind } => match kind {
            CountKind::Pqn { p, q, n, g, common } => {
                check_order(&common)?;
                let needed = n.saturating_sub(1).max(1);
                if needed > common.order {
                    return Err(AtlasError::invalid(format!(
                        "n = {n} needs --order >= {needed}"
                    )));
                }
                println!("{}", genus::pqn_count(p, q, n, g, common.order)?);
                Ok(0)
            }
            CountKind::Abcd { a, b, c, d, g, common } => {
                check_order(&common)?;
                let needed = (a + 1).max(b).max(c + d);
                if needed > common.order {
                    return Err(AtlasError::invalid(format!(
                        "(a,b,c,d) = ({a},{b},{c},{d}) needs --order >= {needed}"
                    )));
                }
                println!("{}", genus::abcd_count(a, b, c, d, g, common.order)?);
                Ok(0)
            }
        },
        Command::Table {
            n_max,
            g_max,
            format,
            common,
        } => {
            check_order(&common)?;
            if n_max.saturating_sub(1) > common.order {
                return Err(AtlasError::invalid(format!(
                    "--n-max {n_max} needs --order >= {}",
                    n_max - 1
                )));
            }
            let table = genus::phi_count_table(n_max, g_max.min(2), common.order)?;
            match format {
                Format::Csv => print!("{}", table.to_csv()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&table.to_json()).unwrap()),
                Format::Text => {
                    for row in &table.rows {
                        println!("p={} q={} n={} g={}: {}", row.p, row.q, row.n, row.g, row.count);
                    }
                }
            }
            Ok(0)
        }
        Command::Series { kind } => match kind {
            SeriesKind::Dump { which, common } => {
                check_order(&common)?;
                let series = genus::series_by_name(&which, common.order)?;
                let payload = json!({
                    "which": which,
                    "order": common.order,
                    "terms": series.dump_terms(),
                });
                println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                Ok(0)
            }
        },
        Command::Psi { partition } => {
            let lambda = parse_partition(&partition)?;
            println!("{}", crate::central::psi(&lambda));
            Ok(0)
        }
        Command::Oracle { kind } => match kind {
            OracleKind::Count { n, filter, common } => {
                let filter = parse_filter(&filter)?;
                if let Some(n) = n {
                    if n != filter.edge_count() {
                        return Err(AtlasError::invalid(format!(
                            "--n {n} conflicts with the filter's edge count {}",
                            filter.edge_count()
                        )));
                    }
                }
                println!("{}", oracle::count(&filter, common.unsafe_order)?);
                Ok(0)
            }
            OracleKind::Verify { max_n, common } => {
                check_order(&common)?;
                let order = common.order.max(max_n.saturating_sub(1));
                let reports = vec![
                    verify::central_checks(max_n, order),
                    verify::oracle_agreement(max_n, order),
                ];
                Ok(print_reports(&reports))
            }
        },
        Command::Verify { max_n, common } => {
            check_order(&common)?;
            let reports = verify::all_suites(max_n, common.order);
            Ok(print_reports(&reports))
        }
    }
}

fn print_reports(reports: &[verify::SuiteReport]) -> i32 {
    let mut failed = false;
    for report in reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        let detail = report.detail.trim_end();
        if detail.contains('\n') {
            println!("{status} {}", report.name);
            for line in detail.lines() {
                println!("    {line}");
            }
        } else {
            println!("{status} {} - {detail}", report.name);
        }
        if !report.passed {
            failed = true;
            break; // name the first failing identity and stop
        }
    }
    if failed {
        2
    } else {
        0
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I>(args: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    init_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters_parse() {
        assert!(matches!(
            parse_filter("pqn(1,1,2,0)").unwrap(),
            oracle::Filter::Pqn { p: 1, q: 1, n: 2, g: 0 }
        ));
        assert!(matches!(
            parse_filter("abcd(0,1,1,0,1)").unwrap(),
            oracle::Filter::Abcd { a: 0, b: 1, c: 1, d: 0, g: 1 }
        ));
        assert!(parse_filter("face_seq(3,1)").is_ok());
        assert!(parse_filter("nope(1)").is_err());
        assert!(parse_filter("pqn(1,1)").is_err());
    }

    #[test]
    fn partitions_parse() {
        assert_eq!(parse_partition("3,1").unwrap().parts(), &[3, 1]);
        assert!(parse_partition("0").is_err());
        assert!(parse_partition("x").is_err());
    }
}
