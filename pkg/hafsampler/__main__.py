"""``python -m hafsampler``."""
from .cli import main

main()
