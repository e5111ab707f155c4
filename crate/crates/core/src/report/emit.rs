//! CSV and JSON rendering. CSV is comma-separated with `\n` line endings and a
//! mandatory header; fields never contain commas (any that sneak in through
//! error text are replaced by `;`). JSON is one object `{config, records, summary}`.

use serde::Serialize;

use super::config::RunConfig;

pub(crate) fn csv_field(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub(crate) fn csv_document<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.into_iter().map(|f| csv_field(&f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize, S: Serialize> {
    config: &'a RunConfig,
    records: &'a [R],
    summary: &'a S,
}

pub(crate) fn json_document<R: Serialize, S: Serialize>(
    config: &RunConfig,
    records: &[R],
    summary: &S,
) -> String {
    let mut out = serde_json::to_string_pretty(&Envelope {
        config,
        records,
        summary,
    })
    .expect("report types serialize infallibly");
    out.push('\n');
    out
}
