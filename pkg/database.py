from sqlmodel import Session, SQLModel, create_engine
from dotenv import load_dotenv
import os

# Load environment variables from .env file
load_dotenv()

DATABASE_URL = os.getenv("GAMMA_INVARIANTS_DB_URL", "sqlite:///./gamma_invariants.db")

_engines = {}


def get_engine(url: str = None):
    url = url or DATABASE_URL
    if url not in _engines:
        connect_args = {"check_same_thread": False} if url.startswith("sqlite") else {}
        _engines[url] = create_engine(url, connect_args=connect_args)
        # import registers the ledger tables on SQLModel.metadata
        import models  # noqa: F401
        SQLModel.metadata.create_all(_engines[url])
    return _engines[url]


# get a session
def get_session(url: str = None):
    with Session(get_engine(url)) as session:
        yield session
