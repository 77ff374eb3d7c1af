use std::str::FromStr;

/// `lo:hi:n[:log]`, `n ≥ 2` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub log: bool,
}

impl GridRange {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.hi;
                }
                let t = i as f64 / last;
                if self.log {
                    self.lo * (self.hi / self.lo).powf(t)
                } else {
                    self.lo + (self.hi - self.lo) * t
                }
            })
            .collect()
    }
}

impl FromStr for GridRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3] == "log" => true,
            4 if parts[3] == "lin" => false,
            _ => return Err(format!("expected lo:hi:n[:log], got {s:?}")),
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| format!("bad number {x:?}: {e}"));
        let lo = num(parts[0])?;
        let hi = num(parts[1])?;
        let count: usize = parts[2].parse().map_err(|e| format!("bad count {:?}: {e}", parts[2]))?;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(format!("range needs 0 < lo < hi, got {lo}:{hi}"));
        }
        if count < 2 {
            return Err(format!("range needs at least 2 points, got {count}"));
        }
        Ok(Self { lo, hi, count, log })
    }
}
