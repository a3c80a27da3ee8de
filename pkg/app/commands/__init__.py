# CLI 하위 명령 (generate / detect / analyze / bench)
