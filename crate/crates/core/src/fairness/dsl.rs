use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::CameraMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterfaceKind {
    Raw,
    Human,
}

impl InterfaceKind {
    pub fn symbol(self) -> char {
        match self {
            InterfaceKind::Raw => 'r',
            InterfaceKind::Human => 'h',
        }
    }
}

/// Control precision in hundredths, 1..=100.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Precision(u8);

impl Precision {
    pub const EXACT: Precision = Precision(100);

    pub fn from_hundredths(h: u8) -> Option<Self> {
        (1..=100).contains(&h).then_some(Precision(h))
    }

    pub fn hundredths(self) -> u8 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 100.0
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

/// A problem setting `SC^<r|h>_<k>{E_x, C_c, P_p}`. Absent clauses mean unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub interface: InterfaceKind,
    /// Human-data level 0..=3. Carried and reported only.
    pub human_data_level: u8,
    pub epm_limit: Option<u32>,
    pub camera_mode: CameraMode,
    pub precision: Option<Precision>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Level1,
    Level2,
    Level3,
    Level4,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Level1, Preset::Level2, Preset::Level3, Preset::Level4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Level1 => "level1",
            Preset::Level2 => "level2",
            Preset::Level3 => "level3",
            Preset::Level4 => "level4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn spec(self) -> ProblemSpec {
        let (interface, k, e, c, p) = match self {
            Preset::Level1 => (InterfaceKind::Raw, 3, 180, CameraMode::Virtual, 100),
            Preset::Level2 => (InterfaceKind::Raw, 2, 160, CameraMode::Virtual, 95),
            Preset::Level3 => (InterfaceKind::Human, 1, 140, CameraMode::Real, 90),
            Preset::Level4 => (InterfaceKind::Human, 0, 120, CameraMode::Real, 85),
        };
        ProblemSpec {
            interface,
            human_data_level: k,
            epm_limit: Some(e),
            camera_mode: c,
            precision: Some(Precision(p)),
        }
    }
}

impl ProblemSpec {
    /// No EPM cap, no camera, exact control.
    pub fn unconstrained(interface: InterfaceKind) -> Self {
        Self {
            interface,
            human_data_level: 0,
            epm_limit: None,
            camera_mode: CameraMode::None,
            precision: None,
        }
    }

    pub fn precision_value(&self) -> f64 {
        self.precision.unwrap_or(Precision::EXACT).value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }

    /// The input with a caret line under the offending byte.
    pub fn annotate(&self, input: &str) -> String {
        format!("{input}\n{}^ {}", " ".repeat(self.position), self.message)
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        for &b in lit.as_bytes() {
            if self.peek() != Some(b) {
                return Err(ParseError::new(self.pos, format!("expected '{}'", b as char)));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.s[start..self.pos]
    }
}

pub fn parse_spec(text: &str) -> Result<ProblemSpec, ParseError> {
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    c.expect("SC^")?;
    let interface = match c.peek() {
        Some(b'r') => InterfaceKind::Raw,
        Some(b'h') => InterfaceKind::Human,
        _ => return Err(ParseError::new(c.pos, "interface must be 'r' or 'h'")),
    };
    c.pos += 1;
    c.expect("_")?;
    let human_data_level = match c.peek() {
        Some(b @ b'0'..=b'3') => b - b'0',
        _ => return Err(ParseError::new(c.pos, "human-data level must be 0..3")),
    };
    c.pos += 1;
    c.expect("{")?;

    let mut spec = ProblemSpec {
        interface,
        human_data_level,
        ..ProblemSpec::unconstrained(interface)
    };
    let mut seen = [false; 3];
    if c.peek() != Some(b'}') {
        loop {
            let at = c.pos;
            let slot = match c.peek() {
                Some(b'E') => 0,
                Some(b'C') => 1,
                Some(b'P') => 2,
                _ => return Err(ParseError::new(at, "unknown clause (expected E, C or P)")),
            };
            if seen[slot] {
                return Err(ParseError::new(at, "duplicate clause"));
            }
            seen[slot] = true;
            c.pos += 1;
            c.expect("_")?;
            match slot {
                0 => spec.epm_limit = Some(parse_epm(&mut c)?),
                1 => {
                    spec.camera_mode = match c.peek() {
                        Some(b'0') => CameraMode::Real,
                        Some(b'1') => CameraMode::Virtual,
                        _ => return Err(ParseError::new(c.pos, "camera clause must be 0 or 1")),
                    };
                    c.pos += 1;
                }
                _ => spec.precision = Some(parse_precision(&mut c)?),
            }
            match c.peek() {
                Some(b',') => {
                    c.pos += 1;
                    while c.peek() == Some(b' ') {
                        c.pos += 1;
                    }
                }
                Some(b'}') => break,
                _ => return Err(ParseError::new(c.pos, "expected ',' or '}'")),
            }
        }
    }
    c.expect("}")?;
    if c.pos != text.len() {
        return Err(ParseError::new(c.pos, "trailing input"));
    }
    Ok(spec)
}

fn parse_epm(c: &mut Cursor<'_>) -> Result<u32, ParseError> {
    let at = c.pos;
    let d = c.digits();
    if d.is_empty() {
        return Err(ParseError::new(at, "EPM limit must be a positive integer"));
    }
    if d[0] == b'0' {
        return Err(ParseError::new(at, "EPM limit must be positive without leading zeros"));
    }
    std::str::from_utf8(d)
        .expect("ascii digits")
        .parse::<u32>()
        .map_err(|_| ParseError::new(at, "EPM limit out of range"))
}

fn parse_precision(c: &mut Cursor<'_>) -> Result<Precision, ParseError> {
    let at = c.pos;
    let whole = c.digits();
    if whole.len() != 1 {
        return Err(ParseError::new(at, "precision must look like d.dd"));
    }
    c.expect(".")?;
    let frac_at = c.pos;
    let frac = c.digits();
    if frac.len() != 2 {
        return Err(ParseError::new(frac_at, "precision needs exactly two decimals"));
    }
    let h = u32::from(whole[0] - b'0') * 100 + u32::from(frac[0] - b'0') * 10 + u32::from(frac[1] - b'0');
    u8::try_from(h)
        .ok()
        .and_then(Precision::from_hundredths)
        .ok_or_else(|| ParseError::new(at, "precision must lie in (0, 1]"))
}

/// Canonical form: clauses in E, C, P order, separated by ", ".
pub fn format_spec(spec: &ProblemSpec) -> String {
    let mut clauses = Vec::new();
    if let Some(e) = spec.epm_limit {
        clauses.push(format!("E_{e}"));
    }
    match spec.camera_mode {
        CameraMode::Real => clauses.push("C_0".to_string()),
        CameraMode::Virtual => clauses.push("C_1".to_string()),
        CameraMode::None => {}
    }
    if let Some(p) = spec.precision {
        clauses.push(format!("P_{p}"));
    }
    format!(
        "SC^{}_{}{{{}}}",
        spec.interface.symbol(),
        spec.human_data_level,
        clauses.join(", ")
    )
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_spec(self))
    }
}

impl FromStr for ProblemSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spec(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level1() {
        let s = parse_spec("SC^r_3{E_180, C_1, P_1.00}").unwrap();
        assert_eq!(s, Preset::Level1.spec());
        assert_eq!(s.precision_value(), 1.0);
    }

    #[test]
    fn level4() {
        let s = parse_spec("SC^h_0{E_120, C_0, P_0.85}").unwrap();
        assert_eq!(s.interface, InterfaceKind::Human);
        assert_eq!(s.human_data_level, 0);
        assert_eq!(s.epm_limit, Some(120));
        assert_eq!(s.camera_mode, CameraMode::Real);
        assert_eq!(s.precision.unwrap().hundredths(), 85);
    }

    #[test]
    fn presets_round_trip() {
        let texts = [
            "SC^r_3{E_180, C_1, P_1.00}",
            "SC^r_2{E_160, C_1, P_0.95}",
            "SC^h_1{E_140, C_0, P_0.90}",
            "SC^h_0{E_120, C_0, P_0.85}",
        ];
        for (preset, text) in Preset::ALL.iter().zip(texts) {
            assert_eq!(format_spec(&preset.spec()), text);
            assert_eq!(format_spec(&parse_spec(text).unwrap()), text);
        }
    }

    #[test]
    fn clause_order_is_free() {
        let a = parse_spec("SC^r_3{P_1.00, E_180}").unwrap();
        assert_eq!(format_spec(&a), "SC^r_3{E_180, P_1.00}");
        assert_eq!(parse_spec("SC^h_2{}").unwrap(), ProblemSpec {
            human_data_level: 2,
            ..ProblemSpec::unconstrained(InterfaceKind::Human)
        });
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse_spec("SC^x_9{}").unwrap_err().position, 3);
        assert_eq!(parse_spec("SC^r_4{}").unwrap_err().position, 5);
        assert_eq!(parse_spec("SC^r_3{Q_1}").unwrap_err().position, 7);
        assert_eq!(parse_spec("SC^r_3{E_1, E_2}").unwrap_err().position, 12);
        assert_eq!(parse_spec("SC^r_3{P_1.01}").unwrap_err().position, 9);
        assert_eq!(parse_spec("SC^r_3{P_0.00}").unwrap_err().position, 9);
        assert_eq!(parse_spec("SC^r_3{E_abc}").unwrap_err().position, 9);
        assert_eq!(parse_spec("SC^r_3{}x").unwrap_err().position, 8);
        let e = parse_spec("SC^x_9{}").unwrap_err();
        assert!(e.annotate("SC^x_9{}").ends_with("   ^ interface must be 'r' or 'h'"));
    }
}
