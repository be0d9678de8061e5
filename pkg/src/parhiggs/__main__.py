from parhiggs.cli import main

raise SystemExit(main())
