use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use prodset_core::auxgraph::{build_aux_graph, GraphMode};
use prodset_core::coverlemma::{cover_sequence, verify_cover};
use prodset_core::extremal::{
    lucas_count_check_with, max_fib_count_from, merge_best, ExtremalResult,
};
use prodset_core::polyseq::{
    admissible_residue, positivity_shift, window_stats_with_budget, window_witness_with_budget,
    PrimeFilter, ResidueFilter,
};
use prodset_core::productset::{build_product_set, sequence_members, BaseSet, Element};
use prodset_core::sequences::{Sequence, TermTable};

use crate::acceptance;
use crate::cli::{Cli, Command, FilterArg, ModeArg};
use crate::error::CliError;
use crate::graphfile::parse_graph;
use crate::io::{read_to_string, write_atomic};
use crate::parse::{
    parse_gamma, parse_poly, parse_poly_factors, parse_residue, parse_sequence, parse_set,
    NumberSet, ResidueArg,
};
use crate::report::{
    edges_csv, to_json, window_csv, CoverReport, ExtremalReport, GraphReport, LucasBoundReport,
    ResidueReport, WindowSummary, WitnessReport,
};

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        }),
    }
}

/// Exhaustive search split by smallest element across the rayon pool.
pub fn fib_extremal(universe: u64, size: usize) -> Result<ExtremalResult, CliError> {
    // surface guard errors before fanning out
    max_fib_count_from(universe, size, 0)?;
    let best = (1..=universe)
        .into_par_iter()
        .map(|first| max_fib_count_from(universe, size, first))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(None, merge_best);
    best.ok_or_else(|| CliError::Input("no subsets to search".into()))
}

fn term_table(seq: Sequence, max_index: Option<u64>, bound: &prodset_core::Natural) -> Result<TermTable, CliError> {
    match max_index {
        Some(m) => Ok(TermTable::up_to_index(seq, m)),
        None if seq.is_monotone() => Ok(TermTable::covering(seq, bound)?),
        None => Err(CliError::Input(format!(
            "{seq} is not monotone; pass --max-index"
        ))),
    }
}

fn lucas_bound<T: Element>(
    base: &BaseSet<T>,
    seq: Sequence,
    max_index: Option<u64>,
) -> Result<LucasBoundReport, CliError> {
    let ps = build_product_set(base)?;
    let table = term_table(seq, max_index, &ps.max_natural().unwrap_or_default())?;
    let r = lucas_count_check_with(base, &table)?;
    Ok(LucasBoundReport::new(seq.to_string(), base.to_string(), &r))
}

fn graph_report<T: Element>(
    base: &BaseSet<T>,
    seq: Sequence,
    mode: GraphMode,
    min_index: u64,
    max_index: Option<u64>,
) -> Result<(GraphReport, String), CliError> {
    let ps = build_product_set(base)?;
    let table = term_table(seq, max_index, &ps.max_natural().unwrap_or_default())?;
    let members = sequence_members(&ps, |v| table.index_of(v).filter(|&i| i >= min_index));
    let g = build_aux_graph(base, &members, mode)?;
    Ok((GraphReport::new(seq.to_string(), &g), edges_csv(&g)))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::FibExtremal {
            universe,
            size,
            out: path,
        } => {
            let best = fib_extremal(universe, size)?;
            emit(out, path.as_deref(), &to_json(&ExtremalReport::from(&best))?)?;
            if best.max_count > size {
                return Err(CliError::Violation(format!(
                    "{} Fibonacci numbers in B·B with |B| = {size}",
                    best.max_count
                )));
            }
        }
        Command::LucasBound {
            set,
            seq,
            max_index,
            out: path,
        } => {
            let seq = parse_sequence(&seq)?;
            let report = match parse_set(&set)? {
                NumberSet::Integers(b) => lucas_bound(&b, seq, max_index)?,
                NumberSet::Rationals(b) => lucas_bound(&b, seq, max_index)?,
            };
            emit(out, path.as_deref(), &to_json(&report)?)?;
            if !report.ok || !report.high_index_ok {
                return Err(CliError::Violation(format!(
                    "count {} (bound {}), index >= 31 count {} (bound {})",
                    report.count, report.bound, report.high_index_count, report.high_index_bound
                )));
            }
        }
        Command::Graph {
            set,
            seq,
            mode,
            min_index,
            max_index,
            dump,
            out: path,
        } => {
            let seq = parse_sequence(&seq)?;
            let mode = match mode {
                ModeArg::One => GraphMode::OneClass,
                ModeArg::Two => GraphMode::TwoClass,
            };
            let (report, csv) = match parse_set(&set)? {
                NumberSet::Integers(b) => graph_report(&b, seq, mode, min_index, max_index)?,
                NumberSet::Rationals(b) => graph_report(&b, seq, mode, min_index, max_index)?,
            };
            if let Some(d) = dump {
                write_atomic(&d, csv.as_bytes())?;
            }
            emit(out, path.as_deref(), &to_json(&report)?)?;
        }
        Command::Window {
            poly,
            r,
            window,
            filter,
            residue,
            auto_shift,
            gamma,
            max_bits,
            out: path,
            summary,
        } => {
            let f = parse_poly(&poly)?;
            let gamma = parse_gamma(&gamma)?;
            let r = if auto_shift { r + positivity_shift(&f)? } else { r };
            let residue = match residue.as_deref().map(parse_residue).transpose()? {
                None => None,
                Some(ResidueArg::Auto) => Some(ResidueFilter::from(&admissible_residue(&f)?)),
                Some(ResidueArg::Fixed(a, m)) => Some(ResidueFilter::new(a, m)?),
            };
            let filter = match filter {
                FilterArg::Above => PrimeFilter::AboveWindow,
                FilterArg::Mid => PrimeFilter::MidRange,
            };
            let stats = window_stats_with_budget(&f, r, window, filter, residue.as_ref(), max_bits)?;
            emit(out, path.as_deref(), &window_csv(&stats))?;
            if let Some(s) = summary {
                let report = WindowSummary {
                    poly: f.to_coefficient_string(),
                    r,
                    window,
                    filter: match filter {
                        PrimeFilter::AboveWindow => "above",
                        PrimeFilter::MidRange => "mid",
                    },
                    residue: residue.map(|rf| ResidueReport {
                        a: rf.residue.to_string(),
                        modulus: rf.modulus.to_string(),
                    }),
                    content: stats.content.to_string(),
                    terms: stats.records.len(),
                    above_count: stats.above_count,
                    mid_count: stats.mid_count,
                    qualifying_count: stats.qualifying_count(),
                    log_smooth: stats.log_smooth,
                    above_ratio: stats.above_ratio(),
                    linear_far_target: gamma.linear_far_target(),
                };
                write_atomic(&s, to_json(&report)?.as_bytes())?;
            }
        }
        Command::Witness {
            poly_factors,
            r,
            window,
            gamma,
            max_bits,
            out: path,
        } => {
            let p = parse_poly_factors(&poly_factors)?;
            let gamma = parse_gamma(&gamma)?;
            let w = window_witness_with_budget(&p, r, window, gamma, max_bits)?;
            let report = WitnessReport::from(&w);
            emit(out, path.as_deref(), &to_json(&report)?)?;
            if !report.fresh_primes_verified {
                return Err(CliError::Violation(
                    "a cover element brings no fresh prime".into(),
                ));
            }
        }
        Command::Cover { graph, out: path } => {
            let lg = parse_graph(&read_to_string(&graph)?)?;
            let g = &lg.graph;
            let seq = cover_sequence(g);
            let report = CoverReport {
                a_count: g.a_count(),
                b_count: g.b_count(),
                degree_bound: g.degree_bound(),
                k: seq.len(),
                sequence: seq.iter().map(|&b| lg.b_labels[b].clone()).collect(),
                verified: verify_cover(g, &seq),
                bound_holds: seq.len() * g.degree_bound() >= g.b_count(),
            };
            emit(out, path.as_deref(), &to_json(&report)?)?;
            if !report.verified || !report.bound_holds {
                return Err(CliError::Violation("cover sequence check failed".into()));
            }
        }
        Command::Selftest => {
            let mut failed = 0;
            for check in acceptance::all_criteria() {
                let outcome = check();
                failed += usize::from(!outcome.passed);
                emit(out, None, &format!("{outcome}\n"))?;
            }
            if failed > 0 {
                return Err(CliError::Violation(format!("{failed} acceptance criteria failed")));
            }
        }
    }
    Ok(())
}
