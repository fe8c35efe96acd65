//! Result table and its CSV/JSON renderings.

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "modulation,channel,source,ebn0_db,esn0_db,ser,ber,ci95_ser,ci95_ber,symbols,errors,seed";

/// One (grid point, source) result. Confidence and count fields exist only
/// for simulated rows; `errors` counts symbol errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub modulation: String,
    pub channel: String,
    pub source: String,
    pub ebn0_db: f64,
    pub esn0_db: f64,
    pub ser: f64,
    pub ber: f64,
    pub ci95_ser: Option<f64>,
    pub ci95_ber: Option<f64>,
    pub symbols: Option<u64>,
    pub errors: Option<u64>,
    pub seed: u64,
}

fn prob(p: f64) -> String {
    format!("{p:.5e}")
}

fn db(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

/// Header plus one `\n`-terminated line per row; probabilities carry six
/// significant digits in scientific notation.
pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [
            r.modulation.clone(),
            r.channel.clone(),
            r.source.clone(),
            db(r.ebn0_db),
            db(r.esn0_db),
            prob(r.ser),
            prob(r.ber),
            opt(r.ci95_ser, prob),
            opt(r.ci95_ber, prob),
            opt(r.symbols, |n| n.to_string()),
            opt(r.errors, |n| n.to_string()),
            r.seed.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Pretty-printed JSON array of rows with a trailing newline.
pub fn to_json(rows: &[Row]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn read_json(text: &str) -> serde_json::Result<Vec<Row>> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theory_row() -> Row {
        Row {
            modulation: "bpsk".into(),
            channel: "awgn".into(),
            source: "theory".into(),
            ebn0_db: 4.0,
            esn0_db: 4.0,
            ser: 0.012_500_818_040_737_558,
            ber: 0.012_500_818_040_737_558,
            ci95_ser: None,
            ci95_ber: None,
            symbols: None,
            errors: None,
            seed: 0,
        }
    }

    #[test]
    fn csv_layout() {
        let mut sim = theory_row();
        sim.source = "sim".into();
        sim.esn0_db = 10.0 * 4f64.log10() + 4.0;
        sim.ci95_ser = Some(0.001);
        sim.ci95_ber = Some(0.0005);
        sim.symbols = Some(8000);
        sim.errors = Some(100);
        sim.seed = 7;
        let csv = to_csv(&[theory_row(), sim]);
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "bpsk,awgn,theory,4,4,1.25008e-2,1.25008e-2,,,,,0");
        assert_eq!(
            lines[2],
            "bpsk,awgn,sim,4,10.0206,1.25008e-2,1.25008e-2,1.00000e-3,5.00000e-4,8000,100,7"
        );
        assert_eq!(lines[3], "");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn db_formatting() {
        assert_eq!(db(-0.0), "0");
        assert_eq!(db(-2.5), "-2.5");
        assert_eq!(db(0.30000000000000004), "0.3");
        assert_eq!(db(3.010299956639812), "3.0103");
    }

    #[test]
    fn json_round_trip() {
        let rows = vec![theory_row(), theory_row()];
        assert_eq!(read_json(&to_json(&rows)).unwrap(), rows);
        let v: serde_json::Value = serde_json::from_str(&to_json(&rows)).unwrap();
        let keys: Vec<&str> = v[0].as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected: Vec<&str> = CSV_HEADER.split(',').collect();
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
    }
}
