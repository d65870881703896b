# Copyright (c) 2026 mcspeedup developers, MIT License
import sys

from .cli import main

sys.exit(main())
