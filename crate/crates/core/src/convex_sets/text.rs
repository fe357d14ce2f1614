//! Line-oriented text form of a [`SetUnion`]:
//!
//! ```text
//! CELL poly v=(0,0);(1,0) cone g=(0,1)
//! CELL ball c=(0,0) r=1.5
//! CELL poly v=(0,0) cone full
//! ```
//!
//! Numbers are written with 17 significant digits so parsing restores them
//! exactly. Blank lines and `#` comments are ignored.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::cell::{Base, ConvexCell};
use super::cone::Cone;
use super::{GeometryError, SetUnion, Vector};

fn write_vector(out: &mut String, v: &Vector) {
    out.push('(');
    for (i, c) in v.coords().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{c:.16e}").expect("writing to a String");
    }
    out.push(')');
}

fn write_list(out: &mut String, vs: &[Vector]) {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        write_vector(out, v);
    }
}

pub fn cell_to_line(cell: &ConvexCell) -> String {
    let mut out = String::from("CELL ");
    match cell.base() {
        Base::Polytope(v) => {
            out.push_str("poly v=");
            write_list(&mut out, v);
        }
        Base::Ball { center, radius } => {
            out.push_str("ball c=");
            write_vector(&mut out, center);
            write!(out, " r={radius:.16e}").expect("writing to a String");
        }
    }
    let cone = cell.cone();
    if cone.is_full() {
        out.push_str(" cone full");
    } else if !cone.is_trivial() {
        out.push_str(" cone g=");
        write_list(&mut out, cone.generators());
    }
    out
}

impl fmt::Display for SetUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cell in self.cells() {
            writeln!(f, "{}", cell_to_line(cell))?;
        }
        Ok(())
    }
}

impl FromStr for SetUnion {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<SetUnion, GeometryError> {
        let mut cells = Vec::new();
        for (k, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cell = parse_cell(line).map_err(|msg| GeometryError::Parse { line: k + 1, msg })?;
            cells.push(cell);
        }
        SetUnion::new(cells)
    }
}

fn parse_vector(s: &str) -> Result<Vector, String> {
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| format!("expected (x,...), got `{s}`"))?;
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("bad number `{c}`: {e}")))
        .collect::<Result<Vec<f64>, String>>()?;
    Vector::new(&coords).map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> Result<Vec<Vector>, String> {
    s.split(';').map(parse_vector).collect()
}

fn parse_cell(line: &str) -> Result<ConvexCell, String> {
    let mut words = line.split_whitespace();
    if words.next() != Some("CELL") {
        return Err("line must start with CELL".into());
    }
    let kind = words.next().ok_or("missing cell kind")?;
    let base = match kind {
        "poly" => {
            let v = words
                .next()
                .and_then(|w| w.strip_prefix("v="))
                .ok_or("expected v=...")?;
            Base::Polytope(parse_list(v)?)
        }
        "ball" => {
            let c = words
                .next()
                .and_then(|w| w.strip_prefix("c="))
                .ok_or("expected c=(...)")?;
            let r = words
                .next()
                .and_then(|w| w.strip_prefix("r="))
                .ok_or("expected r=...")?;
            Base::Ball {
                center: parse_vector(c)?,
                radius: r.parse().map_err(|e| format!("bad radius `{r}`: {e}"))?,
            }
        }
        other => return Err(format!("unknown cell kind `{other}`")),
    };
    let dim = match &base {
        Base::Polytope(v) => v.first().ok_or("empty vertex list")?.dim(),
        Base::Ball { center, .. } => center.dim(),
    };
    let cone = match words.next() {
        None => Cone::trivial(dim),
        Some("cone") => match words.next() {
            Some("full") => Cone::full(dim),
            Some(w) => {
                let g = w.strip_prefix("g=").ok_or("expected g=... or full")?;
                Cone::generated_by(dim, &parse_list(g)?).map_err(|e| e.to_string())?
            }
            None => return Err("missing cone generators".into()),
        },
        Some(w) => return Err(format!("unexpected `{w}`")),
    };
    if let Some(w) = words.next() {
        return Err(format!("trailing `{w}`"));
    }
    ConvexCell::new(base, cone).map_err(|e| e.to_string())
}
