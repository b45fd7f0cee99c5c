//! JSON-lines export and import of the activity log, and a durable file store.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::domain::ActivityEvent;
use crate::error::{Error, Result};
use crate::ids::Seq;
use crate::platform::{EventSink, Platform};

/// One event per line, in seq order, each line terminated by `\n`.
pub fn export_log<W: Write>(events: &[ActivityEvent], out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    for event in events {
        let line = serde_json::to_string(event).map_err(|e| Error::Internal(e.to_string()))?;
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn export_to_string(events: &[ActivityEvent]) -> String {
    let mut buf = Vec::new();
    export_log(events, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("json is utf-8")
}

fn parse_line(line: &str, expected: Seq) -> Result<ActivityEvent> {
    let event: ActivityEvent = serde_json::from_str(line).map_err(|e| Error::SchemaMismatch {
        seq: expected,
        reason: e.to_string(),
    })?;
    if event.seq != expected {
        return Err(Error::SchemaMismatch {
            seq: expected,
            reason: format!("found seq {} where {expected} was expected", event.seq),
        });
    }
    Ok(event)
}

/// Parses an exported log. Strict: every line must be a complete record with
/// the next seq, and the file must end with a newline.
pub fn import_log<R: Read>(mut input: R) -> Result<Vec<ActivityEvent>> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(|e| match e.kind() {
        std::io::ErrorKind::InvalidData => Error::SchemaMismatch {
            seq: 1,
            reason: "log is not utf-8".into(),
        },
        _ => Error::Io(e),
    })?;
    let mut events = Vec::new();
    if text.is_empty() {
        return Ok(events);
    }
    let complete = text.ends_with('\n');
    let lines: Vec<&str> = text.split_terminator('\n').collect();
    for (i, line) in lines.iter().enumerate() {
        let expected = i as Seq + 1;
        if i + 1 == lines.len() && !complete {
            return Err(Error::SchemaMismatch {
                seq: expected,
                reason: "truncated record".into(),
            });
        }
        events.push(parse_line(line, expected)?);
    }
    Ok(events)
}

/// Reads a log file and replays it into a platform.
pub fn import_file(path: &Path) -> Result<Platform> {
    let events = import_log(File::open(path)?)?;
    Platform::from_log(events)
}

pub fn export_file(events: &[ActivityEvent], path: &Path) -> Result<()> {
    let file = File::create(path)?;
    export_log(events, &file)?;
    file.sync_all()?;
    Ok(())
}

/// Append-only log file. Every append is flushed and synced before it is
/// acknowledged.
#[derive(Debug)]
pub struct FileStore {
    path: PathBuf,
    file: File,
}

/// What [`FileStore::open`] found on disk.
#[derive(Debug)]
pub struct Recovered {
    pub events: Vec<ActivityEvent>,
    /// Bytes of a torn final record that were cut off.
    pub truncated_bytes: u64,
}

impl FileStore {
    /// Opens or creates the store. A torn final record (no trailing newline,
    /// or unparseable last line) is cut off; damage anywhere else is an error.
    pub fn open(path: impl Into<PathBuf>) -> Result<(FileStore, Recovered)> {
        let path = path.into();
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;

        let mut events = Vec::new();
        let mut good_len = 0usize;
        let mut start = 0usize;
        while start < bytes.len() {
            let Some(nl) = bytes[start..].iter().position(|b| *b == b'\n') else {
                break;
            };
            let end = start + nl;
            let expected = events.len() as Seq + 1;
            let parsed = std::str::from_utf8(&bytes[start..end])
                .map_err(|e| Error::SchemaMismatch {
                    seq: expected,
                    reason: e.to_string(),
                })
                .and_then(|line| parse_line(line, expected));
            match parsed {
                Ok(event) => {
                    events.push(event);
                    good_len = end + 1;
                    start = end + 1;
                }
                // a garbled last line is a torn write too
                Err(_) if end + 1 == bytes.len() => break,
                Err(e) => return Err(e),
            }
        }
        let truncated_bytes = (bytes.len() - good_len) as u64;
        if truncated_bytes > 0 {
            file.set_len(good_len as u64)?;
            file.sync_all()?;
        }
        file.seek(SeekFrom::End(0))?;
        Ok((
            FileStore { path, file },
            Recovered {
                events,
                truncated_bytes,
            },
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl EventSink for FileStore {
    fn append(&mut self, event: &ActivityEvent) -> Result<()> {
        let mut line = serde_json::to_vec(event).map_err(|e| Error::Internal(e.to_string()))?;
        line.push(b'\n');
        self.file.write_all(&line)?;
        self.file.sync_data()?;
        Ok(())
    }
}

impl Platform {
    /// Opens a durable platform backed by a log file, replaying what is on
    /// disk. Returns how many torn bytes were discarded.
    pub fn open(path: impl Into<PathBuf>) -> Result<(Platform, u64)> {
        let (store, recovered) = FileStore::open(path)?;
        let mut platform = Platform::from_log(recovered.events)?;
        platform.set_sink(Box::new(store));
        Ok((platform, recovered.truncated_bytes))
    }
}
