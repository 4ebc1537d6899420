use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rebel_core::Dataset;

use crate::error::{Error, Result};

/// One Gaussian component of a class.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub class: usize,
    pub mean: [f64; 2],
    /// Symmetric positive definite.
    pub cov: [[f64; 2]; 2],
}

impl Cluster {
    /// Lower Cholesky factor of the covariance.
    fn cholesky(&self) -> Option<[[f64; 2]; 2]> {
        let [[a, b], [b2, c]] = self.cov;
        if a <= 0.0 || b != b2 {
            return None;
        }
        let l00 = a.sqrt();
        let l10 = b / l00;
        let rest = c - l10 * l10;
        (rest > 0.0 && rest.is_finite()).then(|| [[l00, 0.0], [l10, rest.sqrt()]])
    }
}

/// Knobs for drawing a random mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureParams {
    pub classes: usize,
    pub clusters_per_class: usize,
    pub mean_range: (f64, f64),
    /// Covariances are `s·I` with `s` uniform in this range.
    pub scale_range: (f64, f64),
    pub train_per_class: usize,
    pub test_per_class: usize,
}

impl Default for MixtureParams {
    fn default() -> Self {
        Self {
            classes: 4,
            clusters_per_class: 2,
            mean_range: (-5.0, 5.0),
            scale_range: (0.5, 1.5),
            train_per_class: 250,
            test_per_class: 125,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    pub classes: usize,
    pub clusters: Vec<Cluster>,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub seed: u64,
}

impl MixtureSpec {
    /// Draw cluster means and covariances; `seed` also drives sampling.
    pub fn random(params: &MixtureParams, seed: u64) -> Result<Self> {
        let (lo, hi) = params.mean_range;
        let (slo, shi) = params.scale_range;
        if !(lo < hi) || !(0.0 < slo && slo <= shi) {
            return Err(Error::Invalid("mixture ranges must be nonempty with positive scales".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut clusters = Vec::new();
        for class in 0..params.classes {
            for _ in 0..params.clusters_per_class {
                let mean = [rng.random_range(lo..hi), rng.random_range(lo..hi)];
                let s = if slo == shi { slo } else { rng.random_range(slo..shi) };
                clusters.push(Cluster { class, mean, cov: [[s, 0.0], [0.0, s]] });
            }
        }
        let spec = Self {
            classes: params.classes,
            clusters,
            train_per_class: params.train_per_class,
            test_per_class: params.test_per_class,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(format!("invalid mixture spec: {m}")));
        if self.classes < 2 {
            return bad("at least two classes are needed".into());
        }
        if self.train_per_class == 0 || self.test_per_class == 0 {
            return bad("per-class sample counts must be at least 1".into());
        }
        for (i, c) in self.clusters.iter().enumerate() {
            if c.class >= self.classes {
                return bad(format!("cluster {i} belongs to class {} of {}", c.class, self.classes));
            }
            if !c.mean.iter().all(|v| v.is_finite()) {
                return bad(format!("cluster {i} has a non-finite mean"));
            }
            if c.cholesky().is_none() {
                return bad(format!("cluster {i} covariance is not symmetric positive definite"));
            }
        }
        if let Some(class) = (0..self.classes).find(|&k| !self.clusters.iter().any(|c| c.class == k)) {
            return bad(format!("class {class} has no clusters"));
        }
        Ok(())
    }

    /// Parse a `key = value` spec file; `#` starts a comment.
    ///
    /// Besides the [`MixtureParams::parse`] keys, any number of
    /// `cluster = CLASS MX MY SXX SXY SYY` lines (0-based class) replace the
    /// randomly drawn clusters.
    pub fn parse(text: &str) -> Result<Self> {
        let parsed = parse_spec_text(text)?;
        let mut spec = Self::random(&parsed.params, parsed.seed)?;
        if !parsed.clusters.is_empty() {
            spec.clusters = parsed.clusters;
            spec.validate()?;
        }
        Ok(spec)
    }
}

impl MixtureParams {
    /// Keys: `classes`, `clusters_per_class`, `train_per_class`,
    /// `test_per_class`, `seed`, `mean_min`, `mean_max`, `scale_min`,
    /// `scale_max`. Explicit `cluster` lines are rejected here.
    pub fn parse(text: &str) -> Result<Self> {
        let parsed = parse_spec_text(text)?;
        if !parsed.clusters.is_empty() {
            return Err(Error::Invalid("explicit clusters cannot be used where mixtures are drawn at random".into()));
        }
        Ok(parsed.params)
    }
}

struct ParsedSpec {
    params: MixtureParams,
    seed: u64,
    clusters: Vec<Cluster>,
}

fn parse_spec_text(text: &str) -> Result<ParsedSpec> {
    let mut params = MixtureParams::default();
    let mut seed = 0u64;
    let mut clusters = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| Error::Invalid(format!("spec line {}: {m}", i + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        let int = || value.parse::<usize>().map_err(|_| err("expected a nonnegative integer"));
        let float = || value.parse::<f64>().map_err(|_| err("expected a number"));
        match key {
            "classes" => params.classes = int()?,
            "clusters_per_class" => params.clusters_per_class = int()?,
            "train_per_class" => params.train_per_class = int()?,
            "test_per_class" => params.test_per_class = int()?,
            "seed" => seed = value.parse().map_err(|_| err("expected a seed"))?,
            "mean_min" => params.mean_range.0 = float()?,
            "mean_max" => params.mean_range.1 = float()?,
            "scale_min" => params.scale_range.0 = float()?,
            "scale_max" => params.scale_range.1 = float()?,
            "cluster" => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                let [class, v @ ..] = parts.as_slice() else { return Err(err("empty cluster")) };
                let v: Vec<f64> = v
                    .iter()
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err("bad number"))?;
                if v.len() != 5 {
                    return Err(err("cluster needs CLASS MX MY SXX SXY SYY"));
                }
                let class = class.parse::<usize>().map_err(|_| err("bad class index"))?;
                clusters.push(Cluster { class, mean: [v[0], v[1]], cov: [[v[2], v[3]], [v[3], v[4]]] });
            }
            other => return Err(err(&format!("unknown key {other:?}"))),
        }
    }
    Ok(ParsedSpec { params, seed, clusters })
}

/// Class tokens `0..K`, zero-padded so lexicographic order is numeric order.
pub fn class_tokens(k: usize) -> Vec<String> {
    let width = (k.max(2) - 1).to_string().len();
    (0..k).map(|c| format!("{c:0width$}")).collect()
}

fn sample(spec: &MixtureSpec, per_class: usize, stream: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream);
    let mut features = Vec::with_capacity(2 * per_class * spec.classes);
    let mut labels = Vec::with_capacity(per_class * spec.classes);
    for class in 0..spec.classes {
        let own: Vec<&Cluster> = spec.clusters.iter().filter(|c| c.class == class).collect();
        for _ in 0..per_class {
            let c = own[rng.random_range(0..own.len())];
            let l = c.cholesky().expect("validated");
            let (z0, z1): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            features.push(c.mean[0] + l[0][0] * z0);
            features.push(c.mean[1] + l[1][0] * z0 + l[1][1] * z1);
            labels.push(class);
        }
    }
    Ok(Dataset::new(features, 2, labels, spec.classes)?)
}

/// Independent train and test draws from the mixture.
pub fn gen_dataset(spec: &MixtureSpec) -> Result<(Dataset, Dataset)> {
    spec.validate()?;
    Ok((sample(spec, spec.train_per_class, 1)?, sample(spec, spec.test_per_class, 2)?))
}
