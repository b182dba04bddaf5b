from cornellqes.cli import main
import sys

sys.exit(main())
