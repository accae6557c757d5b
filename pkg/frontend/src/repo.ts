// Public repository browser: list shared stories, read and post comments,
// copy a story into the personal workspace.

import { ApiClient } from "./api.js";
import type { StoryView } from "./types.js";

export interface RepoCallbacks {
  onOpenCopy(story: StoryView): void; // copied story opens in the editor
}

export class RepositoryBrowser {
  constructor(
    private readonly api: ApiClient,
    readonly root: HTMLElement,
    private readonly callbacks: RepoCallbacks,
  ) {}

  async refresh(): Promise<void> {
    const stories = await this.api.listPublicStories();
    this.root.textContent = "";
    const list = document.createElement("ul");
    list.className = "public-stories";
    for (const story of stories) {
      list.appendChild(this.storyItem(story));
    }
    this.root.appendChild(list);
  }

  private storyItem(story: StoryView): HTMLLIElement {
    const li = document.createElement("li");
    li.className = "story";
    li.dataset.storyId = story.id;

    const title = document.createElement("span");
    title.className = "story-title";
    title.textContent = `${story.title} by ${story.owner}`;
    li.appendChild(title);

    const count = document.createElement("span");
    count.className = "comment-count";
    count.textContent = ` (${story.comment_count ?? 0} comments)`;
    li.appendChild(count);

    const copy = document.createElement("button");
    copy.className = "copy-story";
    copy.textContent = "Copy to my workspace";
    copy.addEventListener("click", async () => {
      const copied = await this.api.copyStory(story.id);
      this.callbacks.onOpenCopy(copied);
    });
    li.appendChild(copy);

    const commentsButton = document.createElement("button");
    commentsButton.className = "show-comments";
    commentsButton.textContent = "Comments";
    const commentsBox = document.createElement("div");
    commentsBox.className = "comments";
    commentsBox.hidden = true;
    commentsButton.addEventListener("click", async () => {
      commentsBox.hidden = !commentsBox.hidden;
      if (!commentsBox.hidden) await this.renderComments(story.id, commentsBox);
    });
    li.appendChild(commentsButton);
    li.appendChild(commentsBox);
    return li;
  }

  // newest first, straight from the service's ordering
  async renderComments(storyId: string, box: HTMLElement): Promise<void> {
    const comments = await this.api.listComments(storyId);
    box.textContent = "";
    const list = document.createElement("ol");
    list.className = "comment-list";
    for (const comment of comments) {
      const item = document.createElement("li");
      item.textContent = `${comment.author}: ${comment.body}`;
      list.appendChild(item);
    }
    box.appendChild(list);

    const field = document.createElement("input");
    field.className = "comment-input";
    field.placeholder = "Add a comment";
    const post = document.createElement("button");
    post.className = "post-comment";
    post.textContent = "Post";
    post.addEventListener("click", async () => {
      if (field.value.trim() === "") return;
      await this.api.addComment(storyId, field.value);
      await this.renderComments(storyId, box);
    });
    box.appendChild(field);
    box.appendChild(post);
  }
}
