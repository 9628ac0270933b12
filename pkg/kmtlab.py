"""
kmtlab start script
"""

import sys
import logging
from pathlib import Path

from dotenv import load_dotenv

# .env first, so the settings singleton sees it
load_dotenv()

project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from config.settings import get_settings  # noqa: E402
from interfaces.cli import main  # noqa: E402

logging.basicConfig(
    level=get_settings().LOG_LEVEL.upper(),
    stream=sys.stderr,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


if __name__ == "__main__":
    main()
