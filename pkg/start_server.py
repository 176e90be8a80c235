#!/usr/bin/env python3
"""
SlidingK API Server Startup Script
"""

import os
import sys
import uvicorn
from pathlib import Path


def main():
    """Start the SlidingK API server."""
    print("SlidingK API Server")
    print("=" * 40)

    # Check if we're in the right directory
    if not Path("app/main.py").exists():
        print("Error: Please run this script from the project root directory")
        sys.exit(1)

    env_file = Path(".env")
    if env_file.exists():
        print("Loading environment variables from .env file")
        from dotenv import load_dotenv
        load_dotenv()

    host = os.getenv("HOST", "0.0.0.0")
    port = int(os.getenv("PORT", 8000))

    print(f"Starting server at http://{host}:{port}")
    print(f"API Documentation: http://{host}:{port}/docs")
    print(f"Health Check: http://{host}:{port}/health")
    print("\nPress Ctrl+C to stop the server")
    print("=" * 40)

    try:
        uvicorn.run(
            "app.main:app",
            host=host,
            port=port,
            reload=False,
            log_level=os.getenv("SLIDINGK_LOG_LEVEL", "info").lower()
        )
    except KeyboardInterrupt:
        print("\nServer stopped")
    except Exception as e:
        print(f"Server error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
