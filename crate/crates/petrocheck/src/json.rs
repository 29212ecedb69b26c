//! JSON output: 17 significant digits for every float, a schema tag and a
//! content hash that ignores the timestamp.

use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA: &str = "petrocheck/1";

/// Float text with 17 significant digits, e.g. `-1.2500000000000000e-1`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Wraps another formatter and replaces its float output with [`fmt17`].
pub struct Digits17<F>(pub F);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    forward!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        end_object_key(),
        begin_object_value(),
        end_object_value(),
    );
}

fn write_with<F: Formatter, T: Serialize + ?Sized>(value: &T, formatter: F) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(formatter));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn to_compact<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    write_with(value, CompactFormatter)
}

pub fn to_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    write_with(value, PrettyFormatter::with_indent(b"  "))
}

/// `sha256:` followed by the hex digest of the compact 17-digit form.
pub fn content_hash<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let digest = Sha256::digest(to_compact(value)?.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("sha256:{hex}"))
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
pub fn timestamp() -> u64 {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return epoch;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Assemble a report: schema tag, command, config and result, hashed before
/// the timestamp is added.
pub fn report(command: &str, config: &impl Serialize, result: Value, exit_code: i32) -> Result<Value, CliError> {
    let mut doc = Map::new();
    doc.insert("schema".into(), Value::from(SCHEMA));
    doc.insert("command".into(), Value::from(command));
    doc.insert("config".into(), serde_json::to_value(config)?);
    doc.insert("result".into(), result);
    doc.insert("exit_code".into(), Value::from(exit_code));
    let hash = content_hash(&doc)?;
    doc.insert("content_hash".into(), Value::from(hash));
    doc.insert("timestamp".into(), Value::from(timestamp()));
    Ok(Value::Object(doc))
}

/// Recompute the hash of a report, ignoring `timestamp` and `content_hash`.
pub fn rehash(report: &Value) -> Result<String, CliError> {
    let mut doc = report.as_object().cloned().unwrap_or_default();
    doc.remove("timestamp");
    doc.remove("content_hash");
    content_hash(&doc)
}
