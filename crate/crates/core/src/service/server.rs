//! Newline-delimited JSON serving over any byte stream.
//!
//! The reading thread hands request lines to a worker pool; a single writer
//! thread emits responses as they complete, so ordering follows completion
//! rather than arrival. Every response carries its request id.

use std::io::{self, BufRead, BufReader, Write};
use std::net::TcpListener;
use std::num::NonZeroUsize;
use std::thread;

use crossbeam_channel::{bounded, unbounded};

use super::protocol::RewardService;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ServeStats {
    pub requests: usize,
    pub errors: usize,
}

pub fn default_workers() -> usize {
    thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

/// Serves requests from `reader` until end of input, writing responses to `writer`.
///
/// Returns an error on a transport failure in either direction.
pub fn serve_stream<R, W>(service: &RewardService, reader: R, writer: W, workers: usize) -> io::Result<ServeStats>
where
    R: BufRead,
    W: Write + Send,
{
    let workers = workers.max(1);
    let (job_tx, job_rx) = bounded::<String>(workers * 4);
    let (out_tx, out_rx) = unbounded::<(String, bool)>();

    thread::scope(|scope| {
        let writer_handle = scope.spawn(move || -> io::Result<ServeStats> {
            let mut writer = writer;
            let mut stats = ServeStats::default();
            for (line, is_error) in out_rx {
                writer.write_all(line.as_bytes())?;
                writer.write_all(b"\n")?;
                writer.flush()?;
                stats.requests += 1;
                stats.errors += usize::from(is_error);
            }
            Ok(stats)
        });

        for _ in 0..workers {
            let job_rx = job_rx.clone();
            let out_tx = out_tx.clone();
            scope.spawn(move || {
                for line in job_rx {
                    let resp = service.handle_line(&line);
                    let is_error = resp.error.is_some();
                    let text = serde_json::to_string(&resp).expect("responses always serialize");
                    if out_tx.send((text, is_error)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(job_rx);
        drop(out_tx);

        let mut read_result = Ok(());
        for line in reader.lines() {
            match line {
                Ok(line) if line.trim().is_empty() => {}
                Ok(line) => {
                    if job_tx.send(line).is_err() {
                        break;
                    }
                }
                Err(e) => {
                    read_result = Err(e);
                    break;
                }
            }
        }
        drop(job_tx);

        let stats = writer_handle.join().expect("writer thread panicked")?;
        read_result.map(|_| stats)
    })
}

/// Serves standard input to standard output.
pub fn serve_stdio(service: &RewardService, workers: usize) -> io::Result<ServeStats> {
    let stdin = io::stdin();
    let stdout = io::stdout();
    serve_stream(service, stdin.lock(), stdout, workers)
}

/// Accepts connections and serves each one on its own thread.
///
/// With `max_connections` set, returns after that many connections have closed.
pub fn serve_tcp(
    service: &RewardService,
    listener: TcpListener,
    workers: usize,
    max_connections: Option<usize>,
) -> io::Result<()> {
    thread::scope(|scope| {
        let incoming = listener.incoming();
        let incoming: Box<dyn Iterator<Item = io::Result<std::net::TcpStream>>> = match max_connections {
            Some(n) => Box::new(incoming.take(n)),
            None => Box::new(incoming),
        };
        for stream in incoming {
            let stream = stream?;
            scope.spawn(move || {
                let peer = stream.peer_addr().map(|a| a.to_string()).unwrap_or_default();
                let result = stream
                    .try_clone()
                    .and_then(|read_half| serve_stream(service, BufReader::new(read_half), stream, workers));
                if let Err(e) = result {
                    eprintln!("sfr-kit: connection {peer} failed: {e}");
                }
            });
        }
        Ok(())
    })
}
