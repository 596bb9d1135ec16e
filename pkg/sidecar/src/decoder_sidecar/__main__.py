import argparse

import uvicorn

from .app import create_app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="decoder-sidecar",
        description="external decoder endpoint (wire protocol: POST /generate)",
    )
    parser.add_argument("--checkpoint", default=None, help="serialized model; omit for conformance mode")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8081)
    parser.add_argument("--queue-depth", type=int, default=8)
    args = parser.parse_args(argv)

    app = create_app(checkpoint=args.checkpoint, queue_depth=args.queue_depth)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
