use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::Arc;
use std::thread;

use tungstenite::{accept, Message};

use super::{handle_line, Service};

/// Answers each non-blank request line with one response line until EOF.
pub fn serve_lines(
    service: &Service,
    input: impl BufRead,
    mut output: impl Write,
) -> io::Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        writeln!(output, "{}", handle_line(service, &line))?;
        output.flush()?;
    }
    Ok(())
}

pub fn serve_stdio(service: &Service) -> io::Result<()> {
    serve_lines(service, io::stdin().lock(), io::stdout().lock())
}

/// Line protocol over TCP, one thread per connection.
pub fn serve_tcp(service: Arc<Service>, listener: TcpListener) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let service = service.clone();
        thread::spawn(move || {
            let Ok(reader) = stream.try_clone() else {
                return;
            };
            if let Err(e) = serve_lines(&service, BufReader::new(reader), &stream) {
                log::warn!("connection closed: {}", e);
            }
        });
    }
    Ok(())
}

#[allow(clippy::result_large_err)]
fn ws_connection(service: &Service, stream: TcpStream) -> Result<(), tungstenite::Error> {
    let mut ws = accept(stream).map_err(|e| match e {
        tungstenite::HandshakeError::Failure(e) => e,
        tungstenite::HandshakeError::Interrupted(_) => tungstenite::Error::Io(io::Error::new(
            io::ErrorKind::WouldBlock,
            "handshake interrupted",
        )),
    })?;
    loop {
        match ws.read()? {
            Message::Text(text) => {
                let reply = handle_line(service, text.as_str());
                ws.send(Message::text(reply))?;
            }
            Message::Close(_) => return Ok(()),
            _ => {}
        }
    }
}

/// The same protocol with one request per websocket text message.
pub fn serve_ws(service: Arc<Service>, listener: TcpListener) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let service = service.clone();
        thread::spawn(move || match ws_connection(&service, stream) {
            Ok(())
            | Err(tungstenite::Error::ConnectionClosed)
            | Err(tungstenite::Error::AlreadyClosed) => {}
            Err(e) => log::warn!("websocket connection closed: {}", e),
        });
    }
    Ok(())
}
