"""Allow ``python -m cubepad_saliency``."""

from cubepad_saliency.cli.main import main

raise SystemExit(main())
