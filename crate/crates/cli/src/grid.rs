use anyhow::{bail, Context, Result};

/// Parses `lo:hi:n[:log|lin]` or a comma-separated list. Grids must be
/// strictly increasing and positive.
pub fn parse_grid(text: &str, default_spacing: &str) -> Result<Vec<f64>> {
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            bail!("grid `{text}` must look like lo:hi:n or lo:hi:n:log|lin");
        }
        let lo: f64 = parts[0]
            .parse()
            .with_context(|| format!("bad lower end in `{text}`"))?;
        let hi: f64 = parts[1]
            .parse()
            .with_context(|| format!("bad upper end in `{text}`"))?;
        let n: usize = parts[2]
            .parse()
            .with_context(|| format!("bad point count in `{text}`"))?;
        let spacing = parts.get(3).copied().unwrap_or(default_spacing);
        if n == 0 {
            bail!("grid `{text}` needs at least one point");
        }
        if n == 1 {
            vec![lo]
        } else {
            match spacing {
                "lin" => (0..n)
                    .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                    .collect(),
                "log" => {
                    if !(lo > 0.0 && hi > 0.0) {
                        bail!("log grid `{text}` needs positive ends");
                    }
                    let (a, b) = (lo.ln(), hi.ln());
                    let mut v: Vec<f64> = (0..n)
                        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                        .collect();
                    v[0] = lo;
                    v[n - 1] = hi;
                    v
                }
                other => bail!("unknown grid spacing `{other}` (use log or lin)"),
            }
        }
    } else {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad grid value `{s}`"))
            })
            .collect::<Result<_>>()?
    };
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        bail!("grid `{text}` must contain finite positive values");
    }
    if values.windows(2).any(|w| !(w[1] > w[0])) {
        bail!("grid `{text}` must be strictly increasing");
    }
    Ok(values)
}
