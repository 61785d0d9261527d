//! Search reports as JSON and as key/value text.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::quat::format_rational;
use crate::real::format_sig;

use super::body::ConvexBodyOutcome;
use super::search::{HlawkaOutcome, MinimaProductOutcome, SearchConfig};

/// Significant digits of floats in reports.
pub const REPORT_DIGITS: usize = 12;

fn round(x: f64) -> f64 {
    format_sig(x, REPORT_DIGITS).parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round(x)).map_or(Value::Null, Value::Number)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub kind: String,
    pub seed: u64,
    pub samples: usize,
    pub alpha: String,
    pub epsilon: f64,
    pub sum: f64,
    pub mean: f64,
    pub prediction: f64,
    pub integral: f64,
    #[serde(rename = "lattice-file")]
    pub lattice_file: Option<String>,
    pub success: bool,
    #[serde(flatten)]
    pub details: BTreeMap<String, Value>,
}

impl SearchReport {
    fn base(kind: &str, cfg: &SearchConfig, h: &HlawkaOutcome) -> Self {
        let mut details = BTreeMap::new();
        details.insert("best_index".into(), Value::from(h.best_index));
        details.insert("std_error".into(), num(h.std_error));
        details.insert("primitive_only".into(), Value::from(cfg.primitive_only));
        details.insert("m".into(), Value::from(h.family.m));
        details.insert("base_minimum".into(), num(h.family.base_minimum()));
        SearchReport {
            kind: kind.into(),
            seed: cfg.seed,
            samples: cfg.samples,
            alpha: format_rational(&h.family.alpha),
            epsilon: round(h.epsilon),
            sum: round(h.sum),
            mean: round(h.mean),
            prediction: round(h.prediction),
            integral: round(h.integral),
            lattice_file: None,
            success: false,
            details,
        }
    }

    pub fn hlawka(cfg: &SearchConfig, h: &HlawkaOutcome) -> Self {
        let mut r = Self::base("hlawka", cfg, h);
        r.success = h.sum < h.integral + h.epsilon;
        r.details.insert("support_radius_ok".into(), Value::from(true));
        r.details.insert("audit".into(), Value::from(h.audit()));
        r.details.insert("within_three_sigma".into(), Value::from(h.within_three_sigma()));
        r
    }

    pub fn minima_product(cfg: &SearchConfig, o: &MinimaProductOutcome) -> Self {
        let mut r = Self::base("minima-product", cfg, &o.search);
        r.success = o.success;
        let d = &mut r.details;
        d.insert("r".into(), num(o.r));
        d.insert("threshold_radius".into(), num(o.threshold_radius));
        d.insert("r_pow_m".into(), num(o.r_pow_m()));
        d.insert("below_sum_threshold".into(), Value::from(o.search.sum < super::search::RHO_SUM_THRESHOLD));
        d.insert("bound".into(), num(o.bound));
        if let Some(p) = o.product {
            d.insert("product_of_minima".into(), num(p));
        }
        if let Some(mins) = &o.minima {
            d.insert("minima".into(), Value::Array(mins.minima.iter().map(|x| num(x.to_f64())).collect()));
            d.insert(
                "witnesses".into(),
                Value::Array(mins.witnesses.iter().map(|w| Value::from(w.z.clone())).collect()),
            );
        }
        if let Some(o24) = o.orbit_sum {
            d.insert("orbit_sum".into(), num(o24));
            d.insert("orbit_inequality".into(), Value::from(o.orbit_inequality_holds()));
        }
        if let Some(x) = o.density_found {
            d.insert("density_found".into(), num(x));
        }
        if let Some(x) = o.density_rescaled {
            d.insert("density_rescaled".into(), num(x));
            d.insert("density_over_bound".into(), num(x / o.bound));
        }
        r
    }

    pub fn convex_body(cfg: &SearchConfig, o: &ConvexBodyOutcome) -> Self {
        let mut details = BTreeMap::new();
        let best = o.counts[o.best_index];
        details.insert("body".into(), Value::from(o.body.clone()));
        details.insert("m".into(), Value::from(o.best.result.m()));
        details.insert("delta".into(), num(o.delta));
        details.insert("volume_epsilon".into(), num(o.volume_epsilon));
        details.insert("best_index".into(), Value::from(o.best_index));
        details.insert("nonzero_in_body".into(), Value::from(best.nonzero));
        details.insert("counts_divisible_by_24".into(), Value::from(o.all_divisible));
        details.insert("density".into(), num(o.density));
        details.insert("nominal_density".into(), num(o.nominal_density));
        SearchReport {
            kind: "convex-body".into(),
            seed: cfg.seed,
            samples: cfg.samples,
            alpha: format_rational(&o.alpha),
            epsilon: round(o.epsilon),
            sum: best.primitive as f64,
            mean: round(o.mean_primitive()),
            prediction: round(24.0 - o.volume_epsilon),
            integral: round(o.integral),
            lattice_file: None,
            success: o.success,
            details,
        }
    }

    pub fn with_lattice_file(mut self, path: Option<String>) -> Self {
        self.lattice_file = path;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Flat `(key, value)` pairs in a fixed order.
    pub fn entries(&self) -> Vec<(String, String)> {
        let show = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let mut out: Vec<(String, String)> = vec![
            ("kind".into(), self.kind.clone()),
            ("seed".into(), self.seed.to_string()),
            ("samples".into(), self.samples.to_string()),
            ("alpha".into(), self.alpha.clone()),
            ("epsilon".into(), format_sig(self.epsilon, REPORT_DIGITS)),
            ("sum".into(), format_sig(self.sum, REPORT_DIGITS)),
            ("mean".into(), format_sig(self.mean, REPORT_DIGITS)),
            ("prediction".into(), format_sig(self.prediction, REPORT_DIGITS)),
            ("integral".into(), format_sig(self.integral, REPORT_DIGITS)),
            ("lattice-file".into(), self.lattice_file.clone().unwrap_or_else(|| "-".into())),
            ("success".into(), self.success.to_string()),
        ];
        out.extend(self.details.iter().map(|(k, v)| (k.clone(), show(v))));
        out
    }

    pub fn to_text(&self) -> String {
        let width = self.entries().iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        self.entries().iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("key,value\n");
        for (k, v) in self.entries() {
            let v = if v.contains(',') { format!("\"{v}\"") } else { v };
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::search::{ball_radius_for_volume, hlawka_search, prepare_family};
    use crate::construct::testfn::TestFunction;
    use crate::minima::DEFAULT_CAPACITY;
    use crate::real::Precision;

    #[test]
    fn json_round_trip_and_field_names() {
        let f = TestFunction::ball(ball_radius_for_volume(2, 10.0)).unwrap();
        let (fam, eps) = prepare_family(2, &f, None, None, None, Precision::default()).unwrap();
        let cfg = SearchConfig { samples: 20, seed: 4, primitive_only: false, capacity: DEFAULT_CAPACITY };
        let h = hlawka_search(&fam, &f, eps, &cfg).unwrap();
        let r = SearchReport::hlawka(&cfg, &h).with_lattice_file(Some("w.json".into()));
        let json = r.to_json();
        for key in ["seed", "samples", "alpha", "epsilon", "sum", "mean", "prediction", "integral", "lattice-file"] {
            assert!(json.contains(&format!("\"{key}\"")), "{key}");
        }
        let back: SearchReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(r.to_csv().starts_with("key,value\nkind,hlawka\n"));
        assert!(r.to_text().contains("lattice-file"));
    }
}
