"""Allow `python -m seqtax ...` as an alternative to the console script."""
from .cli import main

main()
