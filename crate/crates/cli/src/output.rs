//! Fixed-format CSV tables and line-delimited JSON event records.

use crate::error::{io_err, CliError, Result};
use sdw_core::analysis::{Atom, MeasureSnapshot, Piece};
use sdw_core::interactions::{InteractionEvent, Region, VacuumFan};
use sdw_core::states::FluidState;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits, enough to round-trip any f64.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// CSV table with a one-line header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| num(v)).collect());
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(io_err(path))
}

pub const SNAPSHOT_HEADER: [&str; 10] = ["t", "kind", "id", "lo", "hi", "rho", "u", "e", "anchor", "u_right"];

pub fn emit_snapshot(s: &MeasureSnapshot) -> String {
    let mut t = Table::new(&SNAPSHOT_HEADER);
    for p in &s.pieces {
        let (lo, hi) = (num(p.lo), num(p.hi));
        t.push(match p.region {
            Region::Fluid(f) => vec![num(s.t), "fluid".into(), String::new(), lo, hi, num(f.rho), num(f.u), opt(f.e), String::new(), String::new()],
            Region::Vacuum(v) => vec![
                num(s.t),
                "vacuum".into(),
                String::new(),
                lo,
                hi,
                num(0.0),
                num(v.u_left),
                String::new(),
                num(v.anchor),
                num(v.u_right),
            ],
        });
    }
    for a in &s.atoms {
        t.push(vec![
            num(s.t),
            "atom".into(),
            a.id.to_string(),
            num(a.x),
            num(a.x),
            num(a.mass),
            num(a.speed),
            opt(a.e_s),
            String::new(),
            String::new(),
        ]);
    }
    t.render()
}

fn parse_f(field: &str, line: usize) -> Result<f64> {
    field.parse().map_err(|_| CliError::Config(format!("snapshot line {line}: bad number {field:?}")))
}

fn parse_opt(field: &str, line: usize) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f(field, line).map(Some)
    }
}

pub fn parse_snapshot(text: &str) -> Result<MeasureSnapshot> {
    let mut lines = text.lines();
    if lines.next() != Some(SNAPSHOT_HEADER.join(",").as_str()) {
        return Err(CliError::Config("snapshot: unexpected header".into()));
    }
    let mut snap = MeasureSnapshot { t: 0.0, pieces: Vec::new(), atoms: Vec::new() };
    for (k, line) in lines.enumerate() {
        let n = k + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != SNAPSHOT_HEADER.len() {
            return Err(CliError::Config(format!("snapshot line {n}: expected {} fields", SNAPSHOT_HEADER.len())));
        }
        snap.t = parse_f(f[0], n)?;
        let (lo, hi) = (parse_f(f[3], n)?, parse_f(f[4], n)?);
        let (rho, u, e) = (parse_f(f[5], n)?, parse_f(f[6], n)?, parse_opt(f[7], n)?);
        match f[1] {
            "fluid" => snap.pieces.push(Piece { lo, hi, region: Region::Fluid(FluidState { rho, u, e }) }),
            "vacuum" => snap.pieces.push(Piece {
                lo,
                hi,
                region: Region::Vacuum(VacuumFan { anchor: parse_f(f[8], n)?, u_left: u, u_right: parse_f(f[9], n)? }),
            }),
            "atom" => snap.atoms.push(Atom {
                id: f[2].parse().map_err(|_| CliError::Config(format!("snapshot line {n}: bad id")))?,
                x: lo,
                mass: rho,
                momentum: rho * u,
                speed: u,
                e_s: e,
            }),
            other => return Err(CliError::Config(format!("snapshot line {n}: unknown kind {other:?}"))),
        }
    }
    Ok(snap)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncomingRecord {
    pub id: usize,
    pub xi: f64,
    pub us: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub index: usize,
    pub time: f64,
    pub position: f64,
    pub outcome: String,
    pub participants: Vec<usize>,
    pub incoming: Vec<IncomingRecord>,
    pub result: usize,
    pub gamma: f64,
    pub c0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_s0: Option<f64>,
}

impl EventRecord {
    pub fn from_event(index: usize, e: &InteractionEvent) -> Self {
        EventRecord {
            index,
            time: e.time,
            position: e.position,
            outcome: e.outcome.label().to_string(),
            participants: e.participants.clone(),
            incoming: e.incoming.iter().map(|i| IncomingRecord { id: i.id, xi: i.xi, us: i.us, e_s: i.e_s }).collect(),
            result: e.result,
            gamma: e.gamma,
            c0: e.c0,
            e_s0: e.e_s0,
        }
    }
}

pub fn emit_events(events: &[InteractionEvent]) -> String {
    let mut s = String::new();
    for (i, e) in events.iter().enumerate() {
        let line = serde_json::to_string(&EventRecord::from_event(i, e)).expect("event records serialize");
        writeln!(s, "{line}").unwrap();
    }
    s
}

pub fn parse_events(text: &str) -> Result<Vec<EventRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| CliError::Config(format!("event line {}: {e}", n + 1))))
        .collect()
}
