//! File input/output for the JSON schemas.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use framekit::{Frame, MultiplierSystem};

/// A parsed input file: either a bare frame or a multiplier system.
pub enum Input {
    Frame(Frame),
    System(MultiplierSystem),
}

/// Reads a frame or system, dispatching on the top-level keys.
pub fn read_input(path: &str) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    let is_system = value.get("x").is_some() && value.get("f").is_some();
    if is_system {
        let sys: MultiplierSystem = serde_json::from_value(value)
            .with_context(|| format!("{path} does not match the system schema"))?;
        Ok(Input::System(sys))
    } else {
        let frame: Frame = serde_json::from_value(value)
            .with_context(|| format!("{path} does not match the frame schema"))?;
        Ok(Input::Frame(frame))
    }
}

pub fn read_system(path: &str) -> Result<MultiplierSystem> {
    match read_input(path)? {
        Input::System(sys) => Ok(sys),
        Input::Frame(_) => anyhow::bail!(
            "{path} holds a bare frame; this command needs a multiplier system \
             with fields x, f, and optional symbol"
        ),
    }
}

/// Writes text to the output path, or stdout when none is given.
pub fn emit(output: Option<&str>, text: &str) -> Result<()> {
    match output {
        Some(path) => {
            if let Some(parent) = Path::new(path).parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)
                        .with_context(|| format!("creating directory for {path}"))?;
                }
            }
            fs::write(path, text).with_context(|| format!("writing {path}"))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
