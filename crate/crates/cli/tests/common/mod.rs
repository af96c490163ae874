#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::thread;

use sha2::{Digest, Sha256};

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn preset(name: &str) -> PathBuf {
    crate_dir().join("presets").join(format!("{name}.toml"))
}

pub fn fixtures() -> PathBuf {
    crate_dir().join("fixtures")
}

/// Runs the CLI in-process; returns the exit code and captured stdout.
pub fn cli(args: &[&str]) -> (i32, String) {
    let mut buf = Vec::new();
    let mut full = vec!["pseudotune"];
    full.extend_from_slice(args);
    let code = pseudotune_cli::run_with(full, &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// SHA-256 of every file under `dir`, keyed by relative path.
pub fn checksums(dir: &Path) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut pending = vec![dir.to_path_buf()];
    while let Some(d) = pending.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let path = e.unwrap().path();
            if path.is_dir() {
                pending.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, hex::encode(Sha256::digest(std::fs::read(&path).unwrap()))));
            }
        }
    }
    out.sort();
    out
}

/// A model server on a local port. `handler` maps (route, request JSON) to a
/// status and body. One thread per connection, so concurrent clients work.
pub fn mock_server<F>(handler: F) -> String
where
    F: Fn(&str, &serde_json::Value) -> (u16, String) + Send + Sync + 'static,
{
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let handler = std::sync::Arc::new(handler);
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let handler = handler.clone();
            thread::spawn(move || {
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut request_line = String::new();
                if reader.read_line(&mut request_line).is_err() {
                    return;
                }
                let route = request_line.split_whitespace().nth(1).unwrap_or("/").to_string();
                let mut len = 0;
                loop {
                    let mut line = String::new();
                    if reader.read_line(&mut line).is_err() || line == "\r\n" || line.is_empty() {
                        break;
                    }
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        len = v.trim().parse().unwrap_or(0);
                    }
                }
                let mut body = vec![0; len];
                if reader.read_exact(&mut body).is_err() {
                    return;
                }
                let json: serde_json::Value = serde_json::from_slice(&body).unwrap_or(serde_json::Value::Null);
                let (status, reply) = handler(&route, &json);
                let msg = format!(
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{reply}",
                    reply.len()
                );
                let _ = stream.write_all(msg.as_bytes());
            });
        }
    });
    url
}
