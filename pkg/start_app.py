#!/usr/bin/env python3
"""
Startup script for the arcs FastAPI application.
"""

import sys

from config import FIXTURES_DIR, HOST, LOG_LEVEL, MAX_MODULUS, PORT


def check_environment() -> bool:
    """False when the configured fixtures directory does not exist"""
    if not FIXTURES_DIR.is_dir():
        print(f"[ERROR] Fixtures directory {FIXTURES_DIR} not found; set FIXTURES_DIR to the bundled fixtures")
        return False
    return True


def main() -> int:
    print("=" * 60)
    print("[START] Arcs - FastAPI Application")
    print("=" * 60)

    if not check_environment():
        return 1

    print(f"[INFO] Moduli accepted up to {MAX_MODULUS}")
    print(f"[INFO] Application will be available at: http://{HOST}:{PORT}")

    try:
        import uvicorn
        print("[INFO] Starting FastAPI application...")
        print("[INFO] Press Ctrl+C to stop the server")
        print("=" * 60)

        uvicorn.run(
            "main:app",
            host=HOST,
            port=PORT,
            log_level=LOG_LEVEL.lower(),
        )

    except ImportError:
        print("[ERROR] FastAPI dependencies not installed.")
        print("Please install them with: pip install -r requirements.txt")
        return 1
    except KeyboardInterrupt:
        print("\n[INFO] Application stopped by user")
        return 0
    except Exception as e:
        print(f"[ERROR] Failed to start application: {e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
