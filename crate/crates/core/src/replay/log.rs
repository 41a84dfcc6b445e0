use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fairness::{parse_spec, ProblemSpec};
use crate::replay::ReplayError;

pub const FRLOG_MAGIC: &str = "#frlog";
pub const FRLOG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Agent,
    Player,
}

impl Side {
    pub const ALL: [Side; 2] = [Side::Agent, Side::Player];

    pub fn name(self) -> &'static str {
        match self {
            Side::Agent => "agent",
            Side::Player => "player",
        }
    }
}

impl FromStr for Side {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "agent" => Ok(Side::Agent),
            "player" => Ok(Side::Player),
            _ => Err(()),
        }
    }
}

/// Action kinds a log may contain. Only `MoveCamera` is a camera operation.
pub const ACTION_KINDS: [&str; 7] = [
    "BuildPylon",
    "ProduceProbe",
    "CollectMineral",
    "SelectPoint",
    "SelectRect",
    "MoveCamera",
    "NoOp",
];

pub fn is_camera_kind(kind: &str) -> bool {
    kind == "MoveCamera"
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub step: i64,
    pub side: Side,
    pub action_kind: String,
    pub is_camera: bool,
    pub is_effective: bool,
    pub was_rejected: bool,
    pub payload: String,
}

impl ActionRecord {
    pub fn new(step: i64, side: Side, action_kind: &str, is_effective: bool, was_rejected: bool) -> Self {
        Self {
            step,
            side,
            action_kind: action_kind.to_string(),
            is_camera: is_camera_kind(action_kind),
            is_effective,
            was_rejected,
            payload: String::new(),
        }
    }

    pub fn with_payload(mut self, payload: impl Into<String>) -> Self {
        self.payload = payload.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogHeader {
    pub spec: String,
    pub seed: u64,
    pub config_hash: String,
    pub sides: Vec<Side>,
    pub steps_per_second: u32,
    /// Free-form run manifest, stored verbatim.
    pub manifest: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayLog {
    pub header: LogHeader,
    pub records: Vec<ActionRecord>,
    pub duration_steps: i64,
}

impl ReplayLog {
    pub fn new(spec: &ProblemSpec, seed: u64, config_hash: &str, sides: Vec<Side>, steps_per_second: u32) -> Self {
        Self {
            header: LogHeader {
                spec: spec.to_string(),
                seed,
                config_hash: config_hash.to_string(),
                sides,
                steps_per_second,
                manifest: String::new(),
            },
            records: Vec::new(),
            duration_steps: 0,
        }
    }

    pub fn duration_seconds(&self) -> f64 {
        self.duration_steps as f64 / f64::from(self.header.steps_per_second)
    }

    pub fn side_records(&self, side: Side) -> impl Iterator<Item = &ActionRecord> {
        self.records.iter().filter(move |r| r.side == side)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c == '\\' {
            out.push(match it.next()? {
                '\\' => '\\',
                't' => '\t',
                'n' => '\n',
                'r' => '\r',
                _ => return None,
            });
        } else {
            out.push(c);
        }
    }
    Some(out)
}

fn flag(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

/// Header line, then one tab-separated record per line; every line ends in '\n'.
pub fn write_log(log: &ReplayLog) -> String {
    let h = &log.header;
    let sides: Vec<&str> = h.sides.iter().map(|s| s.name()).collect();
    let mut out = String::new();
    writeln!(
        out,
        "{FRLOG_MAGIC}\tv={FRLOG_VERSION}\tspec={}\tseed={}\tconfig={}\tsides={}\tsps={}\tduration={}\tmanifest={}",
        escape(&h.spec),
        h.seed,
        escape(&h.config_hash),
        sides.join(","),
        h.steps_per_second,
        log.duration_steps,
        escape(&h.manifest),
    )
    .expect("write to string");
    for r in &log.records {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.step,
            r.side.name(),
            r.action_kind,
            flag(r.is_camera),
            flag(r.is_effective),
            flag(r.was_rejected),
            escape(&r.payload)
        )
        .expect("write to string");
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> ReplayError {
    ReplayError::Format {
        line,
        message: message.into(),
    }
}

fn parse_flag(s: &str, line: usize, what: &str) -> Result<bool, ReplayError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(err(line, format!("{what} flag must be 0 or 1"))),
    }
}

pub fn read_log(bytes: &[u8]) -> Result<ReplayLog, ReplayError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1;
        err(line, "invalid UTF-8")
    })?;
    if text.is_empty() {
        return Err(err(1, "header missing"));
    }
    let mut lines: Vec<&str> = text.split('\n').collect();
    // A well-formed file ends in '\n', leaving one empty tail element.
    let tail = lines.pop().expect("split yields at least one element");
    if !tail.is_empty() {
        return Err(err(lines.len() + 1, "truncated line (missing newline)"));
    }

    let header_line = lines[0];
    let mut fields = header_line.split('\t');
    if fields.next() != Some(FRLOG_MAGIC) {
        return Err(err(1, "header missing"));
    }
    let mut kv = std::collections::BTreeMap::new();
    for f in fields {
        let (k, v) = f.split_once('=').ok_or_else(|| err(1, format!("bad header field '{f}'")))?;
        let v = unescape(v).ok_or_else(|| err(1, format!("bad escape in '{k}'")))?;
        kv.insert(k, v);
    }
    let get = |k: &str| kv.get(k).cloned().ok_or_else(|| err(1, format!("header lacks '{k}'")));
    if get("v")? != FRLOG_VERSION.to_string() {
        return Err(err(1, "unsupported version"));
    }
    let spec = get("spec")?;
    parse_spec(&spec).map_err(|e| err(1, format!("header spec: {e}")))?;
    let seed = get("seed")?.parse().map_err(|_| err(1, "bad seed"))?;
    let sides = get("sides")?
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Side>().map_err(|_| err(1, format!("unknown side '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    let steps_per_second: u32 = get("sps")?.parse().map_err(|_| err(1, "bad sps"))?;
    if steps_per_second == 0 {
        return Err(err(1, "sps must be positive"));
    }
    let duration_steps: i64 = get("duration")?.parse().map_err(|_| err(1, "bad duration"))?;
    let header = LogHeader {
        spec,
        seed,
        config_hash: get("config")?,
        sides,
        steps_per_second,
        manifest: kv.get("manifest").cloned().unwrap_or_default(),
    };

    let mut records = Vec::with_capacity(lines.len() - 1);
    let mut last_step = i64::MIN;
    for (i, l) in lines.iter().enumerate().skip(1) {
        let n = i + 1;
        let cols: Vec<&str> = l.split('\t').collect();
        if cols.len() != 7 {
            return Err(err(n, format!("expected 7 fields, found {}", cols.len())));
        }
        let step: i64 = cols[0].parse().map_err(|_| err(n, "bad step"))?;
        if step < last_step {
            return Err(err(n, "step regression"));
        }
        last_step = step;
        let side: Side = cols[1].parse().map_err(|_| err(n, format!("unknown side '{}'", cols[1])))?;
        if !header.sides.contains(&side) {
            return Err(err(n, format!("side '{}' not declared in header", cols[1])));
        }
        let kind = cols[2];
        if !ACTION_KINDS.contains(&kind) {
            return Err(err(n, format!("unknown action kind '{kind}'")));
        }
        let is_camera = parse_flag(cols[3], n, "camera")?;
        if is_camera != is_camera_kind(kind) {
            return Err(err(n, "camera flag disagrees with action kind"));
        }
        records.push(ActionRecord {
            step,
            side,
            action_kind: kind.to_string(),
            is_camera,
            is_effective: parse_flag(cols[4], n, "effective")?,
            was_rejected: parse_flag(cols[5], n, "rejected")?,
            payload: unescape(cols[6]).ok_or_else(|| err(n, "bad escape in payload"))?,
        });
    }
    if records.last().is_some_and(|r| r.step > duration_steps) {
        return Err(err(1, "duration shorter than last record"));
    }
    Ok(ReplayLog {
        header,
        records,
        duration_steps,
    })
}
