"""Run the lp-hodge command line interface."""

from .cli import main

raise SystemExit(main())
